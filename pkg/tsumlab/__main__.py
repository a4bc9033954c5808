"""
Allow `python -m tsumlab`
"""

import sys

from tsumlab.main import main


if __name__ == "__main__":
    sys.exit(main())
