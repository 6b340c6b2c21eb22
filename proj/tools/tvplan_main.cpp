// Placeholder main; the full CLI lands with the pipeline modules.
int main() { return 0; }
