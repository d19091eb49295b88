"""represent init file"""
