"""
params command - derived constants and their identities
"""
from roughdrive.commands.common import add_run_arguments, execute, load_run_config
from roughdrive.services.params import derive_params, identity_residuals
from roughdrive.utils.metrics_printer import MetricsPrinter


def register_params_command(subparsers):
    """Register the params command"""
    parser = subparsers.add_parser('params', help="print derived constants and check their identities")
    add_run_arguments(parser)

    def handle(args):
        config = load_run_config(args, experiments=['constant-identities'])
        params = derive_params(config.H, Y0=config.Y0, T=config.T)
        MetricsPrinter.print_params(params)
        MetricsPrinter.print_section("🔗 Identity Residuals")
        for name, value in identity_residuals(params).items():
            MetricsPrinter.print_metric(name, value)
        return execute(config, "ROUGHDRIVE - PARAMETERS")

    parser.set_defaults(handler=handle)
    return parser
