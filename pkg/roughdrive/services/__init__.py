"""Services package"""
from .params import derive_params, make_drift_pair

__all__ = ['derive_params', 'make_drift_pair']
