package shop;

import java.util.ArrayList;
import java.util.List;

public class Cart {
    private final List<Item> items = new ArrayList<>();
    private Discount discount;
    private Customer owner;

    public Cart(Customer owner) {
        this.owner = owner;
    }

    public void add(Item item) {
        items.add(item);
    }

    public void setDiscount(Discount discount) {
        this.discount = discount;
    }

    public double subtotal() {
        double sum = 0;
        for (Item item : items) {
            sum += item.total();
        }
        return sum;
    }

    public double total() {
        double amount = subtotal();
        if (discount != null) {
            amount = discount.apply(amount);
        }
        if (owner.isPremium() && amount > 50) {
            amount = amount * 0.95;
        }
        return amount;
    }

    public int count() {
        int n = 0;
        for (Item item : items) {
            n += item.getQuantity();
        }
        return n;
    }
}
