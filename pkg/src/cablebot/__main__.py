import sys

from cablebot.cli import main

sys.exit(main())
