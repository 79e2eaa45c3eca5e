import sys

from gaudin_lab.cli import main

sys.exit(main())
