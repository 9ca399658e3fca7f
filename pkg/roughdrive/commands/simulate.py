"""
simulate command - coupled heat-equation run, law check and trace dump
"""
from roughdrive.commands.common import add_run_arguments, execute, load_run_config


def register_simulate_command(subparsers):
    """Register the simulate command"""
    parser = subparsers.add_parser('simulate', help="simulate u, v and xi, check the linear law, dump traces")
    add_run_arguments(parser)
    parser.add_argument('--no-dump', action='store_true', help="skip traces.csv")

    def handle(args):
        config = load_run_config(args, experiments=['linear-law'], dump_traces=not args.no_dump)
        return execute(config, "ROUGHDRIVE - SIMULATION")

    parser.set_defaults(handler=handle)
    return parser
