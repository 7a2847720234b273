"""Field and problem file utilities"""
