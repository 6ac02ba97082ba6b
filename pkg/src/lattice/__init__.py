# 零空間格點模組