"""
設定
從環境變數（.env）讀取預設值
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv

DEFAULT_ARRAY = "55,54,2;1,1,54"
OUTPUT_FORMATS = ("table", "json", "tsv")

PROJECT_ROOT = Path(__file__).resolve().parent.parent


def parse_range(text: str) -> Tuple[int, int]:
    """解析 "5:10" 形式的閉區間"""
    try:
        low, high = (int(part) for part in text.split(":"))
    except ValueError as e:
        raise ValueError(f"範圍格式錯誤: {text!r}（應為 low:high）") from e
    if low > high:
        raise ValueError(f"範圍下界大於上界: {text!r}")
    return low, high


@dataclass
class Settings:
    """環境設定"""

    array: str = DEFAULT_ARRAY
    output_format: str = "table"
    data_dir: Path = field(default_factory=lambda: PROJECT_ROOT / "data")
    workers: int = 1
    log_level: str = "WARNING"
    grid_range: Tuple[int, int] = (5, 10)

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "Settings":
        """載入 .env 後建立設定"""
        load_dotenv(dotenv_path)

        data_dir = Path(os.getenv("MOORE57_DATA_DIR", "data"))
        if not data_dir.is_absolute():
            data_dir = PROJECT_ROOT / data_dir

        output_format = os.getenv("MOORE57_FORMAT", "table").lower()
        if output_format not in OUTPUT_FORMATS:
            raise ValueError(f"MOORE57_FORMAT 不支援: {output_format!r}（可用: {', '.join(OUTPUT_FORMATS)}）")

        return cls(
            array=os.getenv("MOORE57_ARRAY", DEFAULT_ARRAY),
            output_format=output_format,
            data_dir=data_dir,
            workers=max(1, int(os.getenv("MOORE57_WORKERS", "1"))),
            log_level=os.getenv("MOORE57_LOG_LEVEL", "WARNING").upper(),
            grid_range=parse_range(os.getenv("MOORE57_GRID_RANGE", "5:10")),
        )


@dataclass
class RunConfiguration:
    """單次 CLI 執行的設定；未指定的欄位沿用 Settings"""

    subcommand: str
    array: str = DEFAULT_ARRAY
    output_format: str = "table"
    action: Optional[str] = None
    block: Optional[str] = None
    check: bool = False
    audit: bool = False
    grid_size: Optional[int] = None
    grid_range: Tuple[int, int] = (5, 10)
    trials: int = 100
    degree: Optional[int] = None
    budget_nodes: Optional[int] = None
    budget_seconds: Optional[float] = None
    normalize: bool = True
    seed: Optional[int] = None
    output: Optional[Path] = None
    edges: Optional[Path] = None
    data_dir: Path = field(default_factory=lambda: PROJECT_ROOT / "data")
    workers: int = 1

    @classmethod
    def from_settings(cls, settings: Settings, subcommand: str, **overrides) -> "RunConfiguration":
        """以環境設定為底，命令列參數（非 None 者）覆蓋"""
        values = {
            'array': settings.array,
            'output_format': settings.output_format,
            'grid_range': settings.grid_range,
            'data_dir': settings.data_dir,
            'workers': settings.workers,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(subcommand=subcommand, **values)
