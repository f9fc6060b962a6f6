# klinvariants tools package
