# Simplicial modules and Dold-Kan subpackage.
