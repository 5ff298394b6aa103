namespace polaron {}
