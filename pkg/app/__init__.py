"""
dualdata - toolchain for a dependently typed language with data and codata
"""
