import sys

from newton.cli import main

sys.exit(main())
