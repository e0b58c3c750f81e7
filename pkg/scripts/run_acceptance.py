"""Run the acceptance suite and print one line per criterion."""
import pathlib
import sys

import pytest

if __name__ == "__main__":
    here = pathlib.Path(__file__).resolve().parent.parent
    sys.exit(pytest.main([str(here / "tests" / "test_acceptance.py"), "-q", *sys.argv[1:]]))
