"""
GridWalk - maximum-length self-avoiding walks on n x n grid graphs.
"""

__version__ = '1.0.0'
__author__ = 'losthumanity'
