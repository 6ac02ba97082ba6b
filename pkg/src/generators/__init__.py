# 區塊線性系統生成模組