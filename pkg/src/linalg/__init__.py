# Exact linear algebra subpackage.
