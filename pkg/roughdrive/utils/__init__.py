"""Utils package"""
from .file_utils import ensure_output_folder, get_config_hash

__all__ = ['ensure_output_folder', 'get_config_hash']
