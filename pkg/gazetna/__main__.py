import sys

from gazetna.cli import main

sys.exit(main())
