"""
kernel command - stable kernel table and its identities
"""
import os

from roughdrive.commands.common import add_run_arguments, execute, load_run_config
from roughdrive.services import stable_kernel
from roughdrive.services.params import derive_params
from roughdrive.utils.file_utils import ensure_output_folder


def register_kernel_command(subparsers):
    """Register the kernel command"""
    parser = subparsers.add_parser('kernel', help="tabulate p_1 and verify the kernel identities")
    add_run_arguments(parser)
    parser.add_argument('--dump', action='store_true', help="also write the table of the run's alpha as CSV")

    def handle(args):
        config = load_run_config(args, experiments=['kernel-identities'])
        code = execute(config, "ROUGHDRIVE - STABLE KERNEL")
        if args.dump:
            alpha = derive_params(config.H).alpha
            table = stable_kernel.build_table(alpha, config.kernel_resolution)
            path = os.path.join(ensure_output_folder(config.output_dir), 'kernel_table.csv')
            stable_kernel.dump_table(table, path)
            print(f"  table written to {path}")
        return code

    parser.set_defaults(handler=handle)
    return parser
