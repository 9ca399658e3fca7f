"""
Counter-based random streams.

Every (seed, namespace, replica) triple owns an independent Philox stream.
Normals are produced by inverse CDF from exactly one 64-bit draw each, so the
k-th variate of a stream sits at counter k // 4 and any position can be
reached with Philox.advance.
"""
import numpy as np
from scipy.special import ndtri

NAMESPACES = {
    'noise': 1,
    'xi': 2,
    'sample': 3,
}

# Philox4x64 emits four 64-bit words per counter increment
WORDS_PER_COUNTER = 4
_HALF_ULP = 2.0 ** -54
_TOP = 1.0 - 2.0 ** -53


def stream_key(seed, namespace, replica):
    """128-bit Philox key for one replica's stream in a namespace"""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, NAMESPACES[namespace], int(replica)]
    return np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint64)


def replica_stream(seed, namespace, replica, offset=0):
    """
    Generator for one replica, positioned at variate `offset`.

    offset must be a multiple of WORDS_PER_COUNTER.
    """
    if offset % WORDS_PER_COUNTER:
        raise ValueError(f"offset {offset} is not aligned to {WORDS_PER_COUNTER} draws")
    bit_generator = np.random.Philox(key=stream_key(seed, namespace, replica))
    if offset:
        bit_generator.advance(offset // WORDS_PER_COUNTER)
    return np.random.Generator(bit_generator)


def _to_normals(u):
    """In place: uniforms on [0, 1) shifted into (0, 1), then inverse CDF"""
    u += _HALF_ULP
    np.minimum(u, _TOP, out=u)
    return ndtri(u, out=u)


def standard_normals(generator, shape):
    """Inverse-CDF normals; uniforms are shifted into the open interval (0, 1)"""
    return _to_normals(generator.random(shape))


def fill_standard_normals(generators, out):
    """
    out[i] receives the next out[i].size normals of generators[i].

    Same values as standard_normals per generator, with a single inverse-CDF
    pass over the whole block.
    """
    if len(generators) != out.shape[0]:
        raise ValueError(f"{len(generators)} generators for {out.shape[0]} rows")
    for generator, row in zip(generators, out):
        generator.random(out=row)
    return _to_normals(out)
