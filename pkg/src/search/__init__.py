# 置換系統搜尋模組