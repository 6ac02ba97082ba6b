#!/usr/bin/env python3
"""
Moore57 啟動腳本
"""

import sys
from dotenv import load_dotenv

# 載入環境變數
load_dotenv()

def check_dependencies():
    """檢查依賴套件"""
    required_packages = [
        'numpy',
        'sympy',
        'networkx',
        'dotenv',
        'click',
        'rich',
        'jinja2',
        'yaml',
    ]

    missing_packages = []

    for package in required_packages:
        try:
            __import__(package)
        except ImportError:
            missing_packages.append(package)

    if missing_packages:
        print("❌ 缺少以下依賴套件:", file=sys.stderr)
        for package in missing_packages:
            print(f"   - {package}", file=sys.stderr)
        print("\n請執行: pip install -r requirements.txt", file=sys.stderr)
        return False

    return True

def main():
    """主函數"""
    if not check_dependencies():
        sys.exit(1)

    # 沒有參數時重現預設實例的計數表
    args = sys.argv[1:] or ['blocks', 'summary', '--check']

    from cli import cli
    try:
        cli.main(args=args, prog_name='moore57')
    except KeyboardInterrupt:
        print("\n👋 已中斷", file=sys.stderr)
        sys.exit(130)

if __name__ == '__main__':
    main()
