"""Core configuration and grid utilities"""
