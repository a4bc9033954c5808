# 3SUM-Indexing laboratory
__version__ = "1.0.0"
