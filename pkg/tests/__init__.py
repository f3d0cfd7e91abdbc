"""Test package for ccsg-automata."""
