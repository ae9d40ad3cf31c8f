# Zeta evaluation subpackage.
