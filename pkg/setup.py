"""
This is provided for compatibility with other projects.
"""
from setuptools import setup

setup()
