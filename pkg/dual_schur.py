#!/usr/bin/env python3
import argparse
import logging
import sys

from src import COMMANDS, ConfigInvalid, DualSchurError
from src import load_config, parse_config, run, write_outputs

EXIT_CONFIG = 2
EXIT_ERROR = 1


parser = argparse.ArgumentParser(description="Sample and analyse dual Schur measures on partitions in a box.")
parser.add_argument("command", choices=COMMANDS, help="what to compute")
parser.add_argument("-c", "--config", help="path to a JSON experiment config")
parser.add_argument("--seed", type=int, help="root seed (unsigned 64-bit)")
parser.add_argument("--workers", type=int, help="number of sampling processes")
parser.add_argument("--out", help="directory to write results to")
parser.add_argument("--samples", type=int, help="number of Monte Carlo samples")
parser.add_argument("--delta", type=int, nargs="+", dest="deltas", help="gap sizes for the critical command")
parser.add_argument("--grid-step", type=float, help="grid step for limit-shape curves")
parser.add_argument(
    "-d",
    "--debug",
    action="store_true",
    default=False,
    help="print debugging output"
)


def main(argv=None):
    args = parser.parse_args(argv)

    if args.debug:
        logging.basicConfig(level=logging.DEBUG)
    else:
        logging.basicConfig(level=logging.INFO)

    overrides = {
        "seed": args.seed,
        "workers": args.workers,
        "out": args.out,
        "samples": args.samples,
        "deltas": args.deltas,
        "grid_step": args.grid_step,
    }
    try:
        if args.config:
            config = load_config(args.config, overrides)
        else:
            config = parse_config({}, overrides)
        logging.info(f'Starting! {args.command} with results going to {config.out}')
        files = run(args.command, config)
    except ConfigInvalid as e:
        logging.error(f'invalid config: {e}')
        return EXIT_CONFIG
    except DualSchurError as e:
        logging.error(f'{type(e).__name__}: {e}')
        return EXIT_ERROR

    write_outputs(files, config.out)
    logging.info(f'Finished! Wrote {len(files)} files to {config.out}')
    return 0


if __name__ == "__main__":
    sys.exit(main())
