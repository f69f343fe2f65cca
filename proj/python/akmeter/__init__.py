"""Arthurs-Kelly simultaneous position/momentum measurement toolkit."""

try:
    from akmeter._akmeter import *  # noqa: F401,F403  (wheel layout)
except ImportError:
    from _akmeter import *  # noqa: F401,F403  (in-tree build on PYTHONPATH)
