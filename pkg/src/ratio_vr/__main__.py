import sys

from ratio_vr.cli import main

sys.exit(main())
