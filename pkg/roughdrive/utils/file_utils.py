"""
File utilities - output folders, hashing and artifact writers
"""
import csv
import hashlib
import json
import os

CSV_SCHEMA = "roughdrive-csv v1"
FLOAT_FORMAT = "{:.17g}"


def ensure_output_folder(folder):
    """Ensure output folder exists"""
    if not os.path.exists(folder):
        os.makedirs(folder)
    return folder


def canonical_json(payload):
    """Key-sorted compact JSON, the byte form that gets hashed"""
    return json.dumps(payload, sort_keys=True, separators=(',', ':'), default=str)


def get_config_hash(payload):
    """Generate hash of a JSON-serializable configuration"""
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()[:16]


def _format(value):
    if isinstance(value, float):
        return FLOAT_FORMAT.format(value)
    return value


def write_csv(path, header, rows, comments=()):
    """Write a versioned CSV; comment lines follow the schema line"""
    with open(path, 'w', newline='') as f:
        f.write(f"# {CSV_SCHEMA}\n")
        for comment in comments:
            f.write(f"# {comment}\n")
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(v) for v in row])
    return path


def write_plot_data(path, xs, ys):
    """Two-column ascii data file for log-log plots"""
    with open(path, 'w') as f:
        for x, y in zip(xs, ys):
            f.write(f"{FLOAT_FORMAT.format(float(x))} {FLOAT_FORMAT.format(float(y))}\n")
    return path


def write_json(path, payload):
    """Write an indented JSON record"""
    with open(path, 'w') as f:
        json.dump(payload, f, indent=2, sort_keys=False, default=str)
        f.write("\n")
    return path
