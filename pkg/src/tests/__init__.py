"""Package that contains tests.

Don't import anything from there.
"""
