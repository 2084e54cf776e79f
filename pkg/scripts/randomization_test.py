"""Script to run one randomization test, conformal prediction or study. Same arguments as ``randinf``.

Example::

    python scripts/randomization_test.py test one-sample --input data.csv --cols x --exact
"""

import sys

from randomization_inference.cli import parse_and_dispatch

if __name__ == "__main__":
    sys.exit(parse_and_dispatch(sys.argv[1:]))
