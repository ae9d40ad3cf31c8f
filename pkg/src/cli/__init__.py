# Command-line subpackage.
