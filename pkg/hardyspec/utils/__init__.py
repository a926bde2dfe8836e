'''
Utilities package for hardyspec.
'''
