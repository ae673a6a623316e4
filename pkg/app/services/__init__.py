"""
Services that drive the language pipeline
"""
