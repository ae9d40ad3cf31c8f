# zeta-workbench application package.
