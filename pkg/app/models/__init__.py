"""
Data models for the toolchain service
"""
