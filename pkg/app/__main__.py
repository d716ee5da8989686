import sys

from app.main import run_cli

sys.exit(run_cli())
