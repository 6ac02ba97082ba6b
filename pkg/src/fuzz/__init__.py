# 置換系統隨機測試模組