# Conjecture checks subpackage.
