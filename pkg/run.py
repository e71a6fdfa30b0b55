"""
Run the UST toolkit from a source checkout

    python run.py solve instance.cnf --mode measure
"""
import sys
import os
from ustsat.cli import main

# Fix encoding for Windows console
if sys.platform == 'win32':
    os.system('chcp 65001 >nul')
    sys.stdout.reconfigure(encoding='utf-8')

if __name__ == "__main__":
    sys.exit(main())
