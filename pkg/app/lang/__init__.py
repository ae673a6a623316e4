"""
Core of the dualdata language: syntax, parsing, typechecking, evaluation
and de/refunctionalization
"""
