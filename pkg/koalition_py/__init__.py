"""Nowcasts and forecasts of coalition majorities from election polls.

.. platform:: Unix, Windows, Mac
"""

__version__ = "0.1.0"
