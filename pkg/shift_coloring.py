#!/usr/bin/env python

import logging

from src.cli import cli

logging.basicConfig(format='%(message)s', level=logging.INFO)


if __name__ == '__main__':
    cli()
