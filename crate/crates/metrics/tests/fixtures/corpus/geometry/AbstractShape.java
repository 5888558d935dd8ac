package geometry;

public abstract class AbstractShape implements Shape {
    private String name;
    protected int scaleCount;

    protected AbstractShape(String name) {
        this.name = name;
    }

    public String getName() {
        return name;
    }

    public void setName(String name) {
        this.name = name;
    }

    public abstract void scale(double factor);

    public boolean isLargerThan(Shape other) {
        return area() > other.area();
    }
}
