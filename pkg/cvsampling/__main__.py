# -*- coding: utf-8 -*-
import sys
from typing import Optional, Sequence

from cvsampling.argparse import parser
from cvsampling.errors import NumericGuardError
from cvsampling.model import Experiment


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs the requested stage and returns its exit status.

    Args:
        argv: Command-line arguments without the program name; ``sys.argv[1:]`` if omitted.

    Returns:
        status: 0 on success, 1 on a failed verification, 2 on invalid input or a missing artifact, 3 on a numeric guard refusal.
    """
    args = parser.parse_args(argv)
    try:
        experiment = Experiment(args.config, args)
        return experiment.run(args.command)
    except NumericGuardError as e:
        print(f"refused: {e}", file=sys.stderr)
        return 3
    except (ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
