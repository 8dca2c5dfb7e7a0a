#!/usr/bin/env python3
"""
Potential-algebra spectra - Main entry point.

Usage:
    python main.py classify --family hyperbolic --g 9
    python main.py spectrum --family rosen-morse --j 4 --g 1
    python main.py verify --family hyperbolic --j 3/2 --g 9
    python main.py sweep --family hyperbolic --g-range 0.05:0.25:21
"""

import sys

from src.cli import main

if __name__ == '__main__':
    sys.exit(main())
