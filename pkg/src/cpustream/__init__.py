"""Online CPU-utilization forecasting engine and benchmark harness."""

__version__ = "0.1.0"
