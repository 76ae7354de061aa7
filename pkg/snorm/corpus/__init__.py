"""
Built-in model corpus sub-package for snorm.

Contains YAML files, each holding a group of named diagonal models. The
loader module (corpus_registry.py in the parent package) reads these
files at runtime.
"""
