# 輸出格式轉換模組