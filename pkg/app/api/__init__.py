"""
HTTP API for the toolchain service
"""
