"""Models package"""
from .metrics import RunMetrics
from .params import DriftPair, ModelParams
from .paths import PathSample, TimeGrid
from .simulation import CoupledTrace, GridConfig

__all__ = ['RunMetrics', 'DriftPair', 'ModelParams', 'PathSample', 'TimeGrid', 'CoupledTrace', 'GridConfig']
