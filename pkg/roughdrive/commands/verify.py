"""
verify and all commands - registered experiments
"""
from roughdrive.commands.common import add_run_arguments, execute, load_run_config
from roughdrive.models.run import EXPERIMENT_NAMES


def register_verify_command(subparsers):
    """Register the verify command"""
    parser = subparsers.add_parser('verify', help="run selected experiments")
    add_run_arguments(parser)
    parser.add_argument('--experiment', '-e', action='append', choices=EXPERIMENT_NAMES, required=True,
                        help="experiment to run; repeat for several")

    def handle(args):
        config = load_run_config(args, experiments=args.experiment)
        return execute(config, "ROUGHDRIVE - VERIFICATION")

    parser.set_defaults(handler=handle)
    return parser


def register_all_command(subparsers):
    """Register the all command"""
    parser = subparsers.add_parser('all', help="run every experiment listed in the config")
    add_run_arguments(parser)

    def handle(args):
        return execute(load_run_config(args), "ROUGHDRIVE - FULL RUN")

    parser.set_defaults(handler=handle)
    return parser
