# Number fields subpackage.
