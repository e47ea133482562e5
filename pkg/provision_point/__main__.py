import sys

from provision_point.cli import main

sys.exit(main())
