import sys

from conlab.cli import main

sys.exit(main())
