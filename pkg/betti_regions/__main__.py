"""betti_regions.__main__"""

import sys

from betti_regions.cli import main

if __name__ == "__main__":
    sys.exit(main())
