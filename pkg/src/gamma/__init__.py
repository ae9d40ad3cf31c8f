# Gamma engine subpackage.
