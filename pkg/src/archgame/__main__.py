import sys

from archgame.cli import main

sys.exit(main())
