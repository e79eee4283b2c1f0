import sys

from scatterkit.cli import main

sys.exit(main())
