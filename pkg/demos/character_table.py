"""Character table of the binary tetrahedral group with Frobenius-Schur indicators."""
from eichlerkit import get_group
from eichlerkit.chartab import character_table

tab = character_table(get_group("BT"))
print(tab.format_grid())
print("quaternionic 2-dimensional characters:", tab.m_quaternionic())
