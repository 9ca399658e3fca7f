"""Command package"""
from .params import register_params_command
from .kernel import register_kernel_command
from .simulate import register_simulate_command
from .verify import register_verify_command, register_all_command

__all__ = [
    'register_params_command',
    'register_kernel_command',
    'register_simulate_command',
    'register_verify_command',
    'register_all_command',
]
