"""
Testes para recuperacao conjunta de suporte esparso
"""
