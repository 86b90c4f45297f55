print("===PLAN===")
print('{"variant":"actions","steps":[[{"robot":"robot","action":"move_up","args":[]}]]}')
