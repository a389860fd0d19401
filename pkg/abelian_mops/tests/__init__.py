# -*- coding: utf-8 -*-
"""Tests package for abelian_mops"""
