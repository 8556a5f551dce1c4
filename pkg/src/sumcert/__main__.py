import sys

from sumcert.cli import main

sys.exit(main())
