"""Parsing functions for weyl-lab records, configs and CLI value syntax."""
