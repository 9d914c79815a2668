#!/usr/bin/env python3
"""
Запуск движка спектральной устойчивости волн Стокса из командной строки
"""

import sys

from cli import run

if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
