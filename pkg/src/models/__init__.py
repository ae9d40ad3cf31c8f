# Models subpackage.
