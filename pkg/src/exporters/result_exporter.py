"""
結果匯出器
將轉換後的文字與邊列表寫入檔案
"""

import os

import networkx as nx

from src.search.graphs import edge_list


class ResultExporter:
    """結果匯出器"""

    def __init__(self, export_path: str = './exports'):
        self.export_path = export_path
        os.makedirs(export_path, exist_ok=True)

    def _path(self, filename: str) -> str:
        return filename if os.path.isabs(filename) else os.path.join(self.export_path, filename)

    def export_text(self, content: str, filename: str) -> str:
        """匯出文字結果"""
        file_path = self._path(filename)
        parent = os.path.dirname(file_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(file_path, 'w', encoding='utf-8') as f:
            f.write(content)
        return file_path

    def export_edge_list(self, graph: nx.Graph, filename: str) -> str:
        """每行 "u v"，0 起算"""
        return self.export_text(edge_list(graph), filename)
