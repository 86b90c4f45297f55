x = 0
while x < 5:
    if x == 3:
        print("checkpoint")
    x = x + 1
