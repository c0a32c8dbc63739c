"""Figure scripts for gaussthermo scan CSVs.

All numbers are read from the CSV files; nothing is recomputed here
beyond axis autoscaling. Rendering identical inputs twice produces
byte-identical vector output (timestamps are disabled).
"""

__version__ = "0.1.0"
