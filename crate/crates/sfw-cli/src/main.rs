fn main() {
    // scenario runner filled in once the core modules are complete
}
