fn main() {
    println!("heckelab");
}
