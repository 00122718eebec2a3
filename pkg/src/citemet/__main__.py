import sys

from citemet.cli import main

sys.exit(main())
