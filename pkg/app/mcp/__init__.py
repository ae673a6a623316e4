"""
Model Context Protocol (MCP) implementation
""" 