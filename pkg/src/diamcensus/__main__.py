import sys

from diamcensus.cli import main

sys.exit(main())
