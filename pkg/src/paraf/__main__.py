import sys

from paraf.cli import main

sys.exit(main())
