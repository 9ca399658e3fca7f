"""
Arguments and execution shared by the sub-commands
"""
from roughdrive.services.runner import run
from roughdrive.utils.config_loader import load_config
from roughdrive.utils.metrics_printer import MetricsPrinter


def add_run_arguments(parser):
    """--config, --seed and --out"""
    parser.add_argument('--config', required=True, help="JSON run configuration")
    parser.add_argument('--seed', type=int, default=None, help="override the config seed (u64)")
    parser.add_argument('--out', default=None, help="override the output directory")


def load_run_config(args, **overrides):
    """Config file plus command-line overrides; raises ConfigError"""
    overrides.update({'seed': args.seed, 'output_dir': args.out})
    return load_config(args.config, overrides)


def execute(config, title):
    """Run the config with console reporting; returns the exit code"""
    MetricsPrinter.print_header(title)
    manifest = run(config, printer=MetricsPrinter)
    MetricsPrinter.print_run_summary(manifest)
    return int(manifest.exit_code)
