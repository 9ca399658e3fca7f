"""
Main Application - roughdrive command line
Clean modular architecture
"""
import argparse
import logging
import os
import sys

# Ensure UTF-8 encoding for Windows
if sys.platform.startswith('win'):
    import io
    sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8')

from dotenv import load_dotenv

from roughdrive import __version__
from roughdrive.commands import (
    register_all_command, register_kernel_command, register_params_command,
    register_simulate_command, register_verify_command,
)
from roughdrive.errors import ConfigError, ExitCode

logger = logging.getLogger('roughdrive')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='roughdrive',
        description="fBm-driven weak solutions from the fractional stochastic heat equation",
    )
    parser.add_argument('--verbose', '-v', action='store_true', help="debug logging")
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest='command', required=True)

    # Register commands
    register_params_command(subparsers)
    register_kernel_command(subparsers)
    register_simulate_command(subparsers)
    register_verify_command(subparsers)
    register_all_command(subparsers)
    return parser


def configure_logging(verbose=False):
    load_dotenv()
    level = logging.DEBUG if verbose else os.getenv('ROUGHDRIVE_LOG_LEVEL', 'INFO').upper()
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except ConfigError as e:
        print("❌ Configuration error:", file=sys.stderr)
        for violation in e.violations:
            print(f"   • {violation}", file=sys.stderr)
        return int(ExitCode.CONFIG_ERROR)


if __name__ == '__main__':
    sys.exit(main())
