import sys

from eulermag.cli import main

sys.exit(main())
