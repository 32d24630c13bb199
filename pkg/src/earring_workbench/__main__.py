import sys

from earring_workbench.cli import main

sys.exit(main())
