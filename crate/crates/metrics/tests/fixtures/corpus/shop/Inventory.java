package shop;

import java.util.HashMap;
import java.util.Map;

public class Inventory {
    private final Map<String, Item> stock = new HashMap<>();

    public void register(Item item) {
        stock.put(item.getSku(), item);
    }

    public int totalUnits() {
        return stock.values().stream().mapToInt(i -> i.getQuantity()).sum();
    }

    public Item find(String sku) {
        Item item = stock.get(sku);
        if (item == null) {
            throw new IllegalArgumentException("unknown sku " + sku);
        }
        return item;
    }

    public void restockAll(int amount) {
        stock.values().forEach(item -> {
            if (item.getQuantity() < 10) {
                item.restock(amount);
            }
        });
    }
}
