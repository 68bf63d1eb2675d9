# Utilities package: logging and the worker pool
