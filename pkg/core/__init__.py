"""
큐브-사이클 그래프 공간-스펙트럼 제한 툴킷 핵심 모듈
"""

__version__ = "0.3.0"
